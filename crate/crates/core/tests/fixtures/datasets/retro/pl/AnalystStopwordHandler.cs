public class AnalystStopwordHandler
{
    public void SearchAnalyst(Analyst analyst)
    {
        _analystStore.Search(analyst);
    }
    public void SearchStopword(Stopword stopword)
    {
        _stopwordStore.Search(stopword);
    }
}
